// proof of stake kernel 0

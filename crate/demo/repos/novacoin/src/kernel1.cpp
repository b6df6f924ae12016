// proof of stake kernel 1

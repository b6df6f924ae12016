// proof of stake kernel 2

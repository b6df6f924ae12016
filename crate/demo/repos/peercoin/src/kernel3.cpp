// proof of stake kernel 3

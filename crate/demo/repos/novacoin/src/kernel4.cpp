// proof of stake kernel 4

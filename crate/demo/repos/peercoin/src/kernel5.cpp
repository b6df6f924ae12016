// proof of stake kernel 5

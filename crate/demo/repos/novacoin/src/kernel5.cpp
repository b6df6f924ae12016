// novacoin kernel

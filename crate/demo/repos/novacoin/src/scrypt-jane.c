// scrypt-jane

/* scrypt key derivation */
int scrypt() { return 1; }

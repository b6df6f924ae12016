// src/wallet.cpp revision 2
int f5() { return 2; }

// src/wallet.cpp revision 1
int f5() { return 1; }

// src/wallet.cpp revision 0
int f5() { return 0; }

// src/net.cpp revision 2
int f1() { return 2; }

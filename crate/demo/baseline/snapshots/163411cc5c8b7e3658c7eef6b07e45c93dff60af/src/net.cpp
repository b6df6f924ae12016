// src/net.cpp revision 1
int f1() { return 1; }

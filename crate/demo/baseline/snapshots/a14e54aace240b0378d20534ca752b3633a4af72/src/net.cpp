// src/net.cpp revision 0
int f1() { return 0; }

// src/net.h revision 1
int f9() { return 1; }

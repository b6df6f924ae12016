// src/net.h revision 2
int f9() { return 2; }

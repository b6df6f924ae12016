// src/net.h revision 0
int f9() { return 0; }

// src/init.cpp revision 2
int f6() { return 2; }

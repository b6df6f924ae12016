// src/init.cpp revision 1
int f6() { return 1; }

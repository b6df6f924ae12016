// src/init.cpp revision 0
int f6() { return 0; }

// src/util.cpp revision 2
int f2() { return 2; }

// src/util.cpp revision 1
int f2() { return 1; }

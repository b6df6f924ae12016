// src/util.cpp revision 0
int f2() { return 0; }

// src/util.cpp revision 3
int f2() { return 3; }

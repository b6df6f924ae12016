// src/main.cpp revision 2
int f0() { return 2; }

// src/main.cpp revision 1
int f0() { return 1; }

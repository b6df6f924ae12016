// src/main.cpp revision 0
int f0() { return 0; }

// src/main.cpp revision 3
int f0() { return 3; }

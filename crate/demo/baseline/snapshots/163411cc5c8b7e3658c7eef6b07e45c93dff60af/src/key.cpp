// src/key.cpp revision 2
int f4() { return 2; }

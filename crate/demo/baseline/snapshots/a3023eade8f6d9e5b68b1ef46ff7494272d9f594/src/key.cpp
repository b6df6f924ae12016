// src/key.cpp revision 1
int f4() { return 1; }

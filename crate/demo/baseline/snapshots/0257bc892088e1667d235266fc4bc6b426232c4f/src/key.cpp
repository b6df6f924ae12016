// src/key.cpp revision 0
int f4() { return 0; }

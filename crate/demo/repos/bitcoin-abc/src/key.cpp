// src/key.cpp revision 3
int f4() { return 3; }

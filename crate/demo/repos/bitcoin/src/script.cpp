// src/script.cpp revision 2
int f3() { return 2; }

// src/script.cpp revision 1
int f3() { return 1; }

// src/script.cpp revision 0
int f3() { return 0; }

// src/init.cpp revision 3
int f6() { return 3; }

// src/main.h revision 2
int f8() { return 2; }

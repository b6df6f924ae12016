// src/main.h revision 1
int f8() { return 1; }

// src/main.h revision 0
int f8() { return 0; }

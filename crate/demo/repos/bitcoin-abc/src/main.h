// src/main.h revision 3
int f8() { return 3; }

// src/db.cpp revision 2
int f7() { return 2; }

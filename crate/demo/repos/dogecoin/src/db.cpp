// src/db.cpp revision 1
int f7() { return 1; }

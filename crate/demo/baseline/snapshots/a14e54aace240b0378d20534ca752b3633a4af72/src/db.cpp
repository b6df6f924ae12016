// src/db.cpp revision 0
int f7() { return 0; }

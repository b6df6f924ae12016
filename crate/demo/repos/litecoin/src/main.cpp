// Copyright (c) 2011-2013 The Litecoin developers
// litecoin main
int main() { return 2; }

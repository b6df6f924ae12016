// bitcoin-abc rewrite of src/main.cpp

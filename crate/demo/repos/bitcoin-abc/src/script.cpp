// bitcoin-abc rewrite of src/script.cpp

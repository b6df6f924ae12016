// bitcoin-abc rewrite of src/util.cpp

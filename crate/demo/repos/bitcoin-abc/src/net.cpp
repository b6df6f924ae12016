// bitcoin-abc rewrite of src/net.cpp

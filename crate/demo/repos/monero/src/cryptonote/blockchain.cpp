// cryptonote blockchain

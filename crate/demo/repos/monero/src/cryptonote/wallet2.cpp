// cryptonote wallet2

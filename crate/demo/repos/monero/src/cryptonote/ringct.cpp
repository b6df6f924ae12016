// cryptonote ringct

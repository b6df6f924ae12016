// cryptonote tx_pool

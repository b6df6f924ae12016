// equihash proof of work

// gui main

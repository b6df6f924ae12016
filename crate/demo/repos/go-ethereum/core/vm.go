package core
// vm

// dogecoin main, such wow
int main() { return 3; }

// placeholder until fixture generation lands
int main() { return 0; }

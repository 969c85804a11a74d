// placeholder until the scenario engine lands
int main() { return 0; }

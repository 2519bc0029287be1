// Placeholder main; the CLI is assembled once the library modules exist.
int main() { return 0; }

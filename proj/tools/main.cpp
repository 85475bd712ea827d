// Placeholder entry point; the subcommand dispatcher lands once the
// pipeline modules are in place.
int main() { return 0; }

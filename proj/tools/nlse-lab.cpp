#include "app.hpp"

int main(int argc, char** argv) { return nlse::cli::run_app(argc, argv); }

#pragma once

namespace nflab::cli {

// Entry point for the nflab tool. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace nflab::cli

#ifndef L2GRAPH_CLI_HPP
#define L2GRAPH_CLI_HPP

#include <iostream>

namespace l2graph {

// Entry point behind main(), parameterized over the output streams so
// tests can drive the binary in-process.  Returns the process exit code:
// 0 success, 1 usage or data error, 2 verification failure.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

} // namespace l2graph

#endif

#ifndef CAPSEP_CLI_HPP
#define CAPSEP_CLI_HPP

namespace capsep::cli {

/// Entry point of the capsep command-line tool. Exit codes: 0 success,
/// 2 configuration error, 3 no shooting bracket, 4 numerical failure.
int run(int argc, char** argv);

} // namespace capsep::cli

#endif

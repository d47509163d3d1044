#ifndef VEGFLOW_CLI_HPP_
#define VEGFLOW_CLI_HPP_

#include <iosfwd>
#include <string>

namespace vegflow {

// Subcommand entry points; return process exit codes (0 ok, 1 failed
// checks/runs, 2 usage or input errors).
int cli_run(const std::string& config_path, std::ostream& out, std::ostream& err);
int cli_check(const std::string& suite, std::ostream& out, std::ostream& err);
int cli_geom(const std::string& config_path, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

}  // namespace vegflow

#endif  // VEGFLOW_CLI_HPP_

#pragma once

#include "table.hpp"
#include "vacuum/cli/app.hpp"

namespace vacuum::cli {

struct CommandResult {
    Table table;
    int exit_code = exit_ok;
};

CommandResult cmd_kernel(const RunConfig& config);
CommandResult cmd_transform(const RunConfig& config);
CommandResult cmd_energy(const RunConfig& config);
CommandResult cmd_equiv_check(const RunConfig& config);
CommandResult cmd_pde_check(const RunConfig& config);
CommandResult cmd_coeffs(const RunConfig& config);

}  // namespace vacuum::cli

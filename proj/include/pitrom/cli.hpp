#pragma once

namespace pitrom {

/// Command-line driver. Exit code 0 on success, 2 on usage errors, 1 on any
/// pipeline failure.
int cli_main(int argc, char** argv);

}  // namespace pitrom

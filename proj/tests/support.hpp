#pragma once

#include <string>

// Path to the command-line binary, harvested from --qwalk-bin=<path> by the
// test main. Empty when the flag was not given; CLI-spawning tests skip then.
extern std::string g_qwalk_bin;

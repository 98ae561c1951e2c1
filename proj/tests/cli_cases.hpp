#pragma once

// Invocations pinned by the CLI contract, shared by the unit suite and the
// acceptance runner.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cli_cases {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Golden {
  std::string file;
  std::vector<std::string> args;
  int exit_code;
};

inline std::vector<Golden> goldens(const std::string& fixtures) {
  const auto z4_file = fixtures + "/z4.json";
  return {
      {"free_bool2_1", {"free", "--builtin", "bool2", "--arity", "1", "--json"}, 0},
      {"free_z4file_1", {"free", "--algebra", z4_file, "--arity", "1", "--json"}, 0},
      {"cop_bool2_2", {"cop", "--builtin", "bool2", "--arity", "2", "--points", "0,1;1,0", "--json"}, 0},
      {"vop_z4_sub_1", {"vop", "--builtin", "z4", "--ground", "z2-in-z4", "--arity", "1", "--relation", "x0=zero", "--json"}, 0},
      {"closure_semilat2_1", {"closure", "--builtin", "semilat2", "--arity", "1", "--points", "", "--json"}, 0},
      {"radical_z4_sub_1", {"radical", "--builtin", "z4", "--ground", "z2-in-z4", "--arity", "1", "--relation", "", "--json"}, 0},
      {"null_z4_sub_1", {"null", "--builtin", "z4", "--ground", "z2-in-z4", "--arity", "1", "--all", "--json"}, 0},
      {"zariski_semilat2_1", {"zariski", "--builtin", "semilat2", "--arity", "1", "--json"}, 0},
      {"adjoint_bool2_1", {"adjoint", "--builtin", "bool2", "--arity", "1", "--points", "0", "--relation", "", "--json"}, 0},
      {"represent_bool2_2", {"represent", "--builtin", "bool2", "--arity", "2", "--relation", "", "--json"}, 0},
      {"stone_1", {"stone", "--arity", "1", "--json"}, 0},
      {"classify_z4_sub_1", {"classify", "--builtin", "z4", "--ground", "z2-in-z4", "--arity", "1", "--json"}, 0},
      {"builtins", {"builtins", "--json"}, 0},
      {"error_not_stable", {"represent", "--builtin", "bool2", "--arity", "1", "--relation", "x0=one", "--json"}, 1},
      {"error_budget", {"free", "--builtin", "bool2", "--arity", "4", "--budget", "1000", "--json"}, 3},
  };
}

using Invocation = std::pair<std::vector<std::string>, int>;

/// Argument vectors with the exit code each must produce.
inline std::vector<Invocation> exit_cases(const std::string& fixtures) {
  const auto bad = [&](const std::string& name) { return fixtures + "/" + name + ".json"; };
  return {
      {{"builtins"}, 0},
      {{"--help"}, 0},
      {{"free", "--help"}, 0},
      {{"cop", "--builtin", "z2", "--ground", "z4", "--arity", "1", "--points", "1"}, 1},
      {{"cop", "--builtin", "z2", "--ground", "bool2", "--arity", "1", "--points", "1"}, 1},
      {{"represent", "--builtin", "bool2", "--arity", "2", "--relation", "x0=x1"}, 1},
      {{"null", "--builtin", "bool2", "--arity", "1", "--relation", "x0=one"}, 1},
      {{"null", "--builtin", "bool2", "--arity", "1", "--relation", "x0=one", "--congruence"}, 0},
      {{}, 2},
      {{"frobnicate"}, 2},
      {{"free", "--builtin", "nope"}, 2},
      {{"free", "--builtin", "bool2", "--algebra", bad("bool2")}, 2},
      {{"free", "--builtin", "bool2", "--arity", "x"}, 2},
      {{"free", "--algebra", bad("bad_range")}, 2},
      {{"free", "--algebra", bad("bad_ragged")}, 2},
      {{"free", "--algebra", bad("bad_syntax")}, 2},
      {{"free", "--algebra", bad("bad_field")}, 2},
      {{"vop", "--builtin", "bool2", "--relation", "foo(x0)=x0"}, 2},
      {{"vop", "--builtin", "bool2", "--relation", "and(x0)=x0"}, 2},
      {{"vop", "--builtin", "bool2", "--relation", "x3=x0"}, 2},
      {{"cop", "--builtin", "bool2", "--arity", "2", "--points", "0,2"}, 2},
      {{"free", "--builtin", "bool2", "--arity", "4", "--budget", "1000"}, 3},
      {{"stone", "--arity", "4"}, 3},
  };
}

/// Commands whose output must not change between reruns.
inline std::vector<std::vector<std::string>> rerun_cases() {
  return {
      {"null", "--builtin", "bool2", "--arity", "2", "--all", "--json"},
      {"zariski", "--builtin", "z2", "--arity", "3", "--json"},
      {"adjoint", "--builtin", "bool2", "--arity", "1", "--target-arity", "2", "--points", "0;1", "--relation", "x0=x1"},
      {"classify", "--builtin", "distlat2", "--arity", "2"},
  };
}

}  // namespace cli_cases

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "winpred/evaluation.hpp"

namespace winpred {

// Sweep grid file: one run per `[run]` block of `key = value` lines. Blank
// lines and text after `#` are ignored. Keys (defaults in parentheses):
//
//   id                  run label (run<N>)
//   representation      hero | ingame (ingame)
//   t                   window end minute for ingame (20)
//   include_timestamps  true | false (false)
//   learner             lr | rf (lr)
//   ridge, max_iterations, tolerance, standardize
//                       LR settings; standardize defaults to true for ingame
//   trees, features_per_split, max_depth, min_leaf
//                       RF settings (100, 0 = auto, 0 = unlimited, 1)
//   seed                RF and selection seed (1)
//   selection           all | cfs | wrapper | single:<feature> (all)
//   folds, stale_limit  wrapper CV folds (5), best-first stale limit (5)
//   split               chronological:<fraction> | tournament:<id>
//                       (chronological:0.66)
//   roster              hero roster size (113)
//
// `defaults` apply to every block unless the block sets the key itself.
// Throws Error(InvalidConfig) naming the offending line.
std::vector<RunConfig> parse_grid(std::string_view text,
                                  const std::map<std::string, std::string>& defaults = {});

}  // namespace winpred

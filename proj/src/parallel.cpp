// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/parallel.hpp"

#include <atomic>

namespace viewret {

namespace {
std::atomic<unsigned> g_max_threads{0};
}  // namespace

void set_max_threads(unsigned n) { g_max_threads.store(n); }

unsigned max_threads() {
  const unsigned n = g_max_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace viewret

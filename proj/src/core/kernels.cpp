#include "gv/core/kernels.hpp"

#include <atomic>

namespace gv::kernels {

namespace {
std::atomic<Exec> g_default{Exec::Parallel};
}

Exec default_exec() { return g_default.load(std::memory_order_relaxed); }
void set_default_exec(Exec e) { g_default.store(e, std::memory_order_relaxed); }

}  // namespace gv::kernels

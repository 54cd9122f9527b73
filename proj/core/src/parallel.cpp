#include "polarproj/parallel.hpp"

#include <cstdlib>
#include <string>

namespace polarproj {

namespace {
std::atomic<int> g_override{0};
}

int thread_count() {
    if (const int o = g_override.load(); o > 0) return o;
    if (const char* env = std::getenv("POLARPROJ_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int threads) { g_override.store(threads > 0 ? threads : 0); }

}  // namespace polarproj

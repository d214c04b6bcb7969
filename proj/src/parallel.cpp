#include "tontine/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tontine {

unsigned default_worker_count() {
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TONTINE_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0) {
                workers = std::min(workers, static_cast<unsigned>(cap));
            }
        } catch (const std::exception&) {
            // unparsable values are ignored
        }
    }
    return workers;
}

}  // namespace tontine

#pragma once

namespace bipot {

/// Caps the OpenMP worker count. Values < 1 restore the default.
void set_max_threads(int n);
/// Applies BIPOT_THREADS from the environment, if set.
void apply_thread_env();
int max_threads();

} // namespace bipot

#pragma once

namespace lplra {

// Global worker cap for the OpenMP kernels. 0 means "use the OpenMP default".
// Every parallel kernel in the library has a serial reference twin; results
// must not depend on this setting (the kernels partition work into fixed
// blocks and reduce in index order).
void set_max_threads(int n);
int max_threads();

} // namespace lplra

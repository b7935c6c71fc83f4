#include <chrono>
#include <iomanip>
#include <iostream>
#include <random>

#include "dilatic/matrix.hpp"

using namespace dilatic;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (auto& z : m.data()) z = cplx{dist(rng), dist(rng)};
    return m;
}

template <typename F>
double time_ms(F&& f, int reps) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

} // namespace

int main() {
    std::mt19937_64 rng(42);
    std::cout << std::setw(6) << "N" << std::setw(14) << "serial ms" << std::setw(14)
              << "omp ms" << std::setw(10) << "speedup" << std::setw(12) << "max diff"
              << "\n";
    for (std::size_t n : {64, 128, 256, 384, 512}) {
        const ComplexMatrix a = random_matrix(n, rng);
        const ComplexMatrix b = random_matrix(n, rng);
        const int reps = n <= 128 ? 20 : 5;

        ComplexMatrix ref(1, 1), par(1, 1);
        const double t_serial = time_ms([&] { ref = serial::matmul(a, b); }, reps);
        const double t_par = time_ms([&] { par = parallel::matmul(a, b); }, reps);
        const double diff = (ref - par).max_abs();

        std::cout << std::setw(6) << n << std::setw(14) << std::fixed
                  << std::setprecision(3) << t_serial << std::setw(14) << t_par
                  << std::setw(10) << std::setprecision(2) << t_serial / t_par
                  << std::setw(12) << std::scientific << std::setprecision(2) << diff
                  << "\n";
    }
    return 0;
}

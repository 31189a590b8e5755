// Runs the numbered acceptance criteria; one line per criterion, exit 1 if any fails.

#include <qperiods/qperiods.hpp>

#include <chrono>
#include <cstdio>

int main()
{
    using clock = std::chrono::steady_clock;
    int failed = 0;
    for (int n = 1; n <= qperiods::criterion_count; ++n) {
        const auto start = clock::now();
        const auto rep = qperiods::run_criterion(n);
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        std::printf("criterion %2d %-4s %s (%.1fs)\n", n, rep.pass() ? "PASS" : "FAIL", rep.title.c_str(), secs);
        for (const auto &c : rep.checks) {
            std::printf("    %-4s %-50s value %.3e  threshold %.3e\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                        c.threshold);
        }
        failed += !rep.pass();
    }
    std::printf("%d of %d criteria passed\n", qperiods::criterion_count - failed, qperiods::criterion_count);
    return failed == 0 ? 0 : 1;
}

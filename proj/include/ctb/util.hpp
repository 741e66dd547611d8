#pragma once

#include <chrono>

namespace ctb {

class wall_timer
{
public:
    wall_timer() : start_(std::chrono::steady_clock::now()) {}

    double elapsed() const
    {
        auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(now - start_).count();
    }

    void reset() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace ctb

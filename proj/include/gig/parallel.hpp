#pragma once

namespace gig {

// Size of the worker pool used by every parallel kernel. Defaults to the
// OpenMP runtime's choice (usually the machine's hardware concurrency).
void set_thread_count(int n);
int thread_count();

// Runs the enclosed scope with the kernels forced onto one thread, then
// restores the previous setting. Used to obtain serial baselines.
class SerialScope {
public:
    SerialScope();
    ~SerialScope();
    SerialScope(const SerialScope&) = delete;
    SerialScope& operator=(const SerialScope&) = delete;

private:
    int saved_;
};

} // namespace gig

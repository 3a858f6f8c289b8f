#pragma once

// Mutation hooks for the test suites. Only compiled into the
// KNOT_TEST_HOOKS variant of the library.

#ifdef KNOT_TEST_HOOKS

namespace knot::testing {

// While alive, the Ref sort rule adds 0 instead of 1 on this thread.
class RefBumpDisabled {
public:
    RefBumpDisabled();
    ~RefBumpDisabled();
    RefBumpDisabled(const RefBumpDisabled &) = delete;
    RefBumpDisabled &operator=(const RefBumpDisabled &) = delete;

private:
    bool previous_;
};

}  // namespace knot::testing

#endif

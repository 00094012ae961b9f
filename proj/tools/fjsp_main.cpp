#include <cstdio>

int main() {
    std::puts("fjsp: cli not wired yet");
    return 1;
}

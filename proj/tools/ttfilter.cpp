#include <iostream>

int main() {
  std::cout << "ttfilter\n";
  return 0;
}

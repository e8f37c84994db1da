// Stand-in translation backend speaking the line protocol on stdin/stdout.
//
//   mock_translator echo     one fixed formula, weight 1
//   mock_translator two      two formulas weighted 0.6 / 0.4
//   mock_translator mixed    one unparsable and one valid candidate
//   mock_translator invalid  only unparsable candidates
//   mock_translator garbage  a line without a weight
//   mock_translator hang     reads the request and never answers
//   mock_translator exit     exits without answering

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo";
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.rfind("TRANSLATE\t", 0) != 0) return 1;
    if (mode == "echo") {
      std::cout << "believes(player, formula(empty(box3)))\t1\n";
    } else if (mode == "two") {
      std::cout << "believes(player, formula(empty(box3)))\t0.6\n"
                << "believes(player, might(empty(box2)))\t0.4\n";
    } else if (mode == "mixed") {
      std::cout << "believes(player, empty(box3))\t0.7\n"
                << "certain_that(player, formula(empty(box1)))\t0.3\n";
    } else if (mode == "invalid") {
      std::cout << "believes(player, empty(box3))\t1\n";
    } else if (mode == "garbage") {
      std::cout << "this is not a candidate\n";
    } else if (mode == "hang") {
      std::this_thread::sleep_for(std::chrono::seconds(60));
    } else {
      return 0;
    }
    std::cout << "\n" << std::flush;
  }
  return 0;
}

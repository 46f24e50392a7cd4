#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "subfbm/errors.hpp"
#include "subfbm/parallel.hpp"

using namespace subfbm;

TEST(Parallel, EveryIndexRunsOnceForAnyWorkerCount) {
  for (std::size_t workers : {1u, 2u, 4u, 16u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) ASSERT_EQ(h, 1);
  }
}

TEST(Parallel, RethrowsTaskFailure) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Parallel, ReadsEnvironment) {
  ::setenv("SUBFBM_PARALLELISM", "3", 1);
  EXPECT_EQ(parallelism_from_environment(), 3u);
  EXPECT_EQ(resolve_parallelism(0), 3u);
  EXPECT_EQ(resolve_parallelism(5), 5u);
  for (const char* bad : {"0", "-2", "four", "3x"}) {
    ::setenv("SUBFBM_PARALLELISM", bad, 1);
    EXPECT_THROW((void)parallelism_from_environment(), DomainError) << bad;
  }
  ::unsetenv("SUBFBM_PARALLELISM");
  EXPECT_GE(parallelism_from_environment(), 1u);
}

#include "tsb/two_task.hpp"

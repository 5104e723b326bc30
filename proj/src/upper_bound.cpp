#include "tsb/upper_bound.hpp"

#include "sg/suite.hpp"

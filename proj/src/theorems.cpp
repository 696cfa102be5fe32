#include "sg/theorems.hpp"

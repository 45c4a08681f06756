# local and global heights package
